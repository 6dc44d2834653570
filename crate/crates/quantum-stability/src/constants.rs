//! Euler's constant and zeta values to 520 significant digits.

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: &str = "0.5772156649015328606065120900824024310421593359399235988057672348848677267776646709369470632917467495146314472498070824809605040144865428362241739976449235362535003337429373377376739427925952582470949160087352039481656708532331517766115286211995015079847937450857057400299213547861466940296043254215190587755352673313992540129674205137541395491116851028079842348775872050384310939973613725530608893312676001724795378367592713515772261027349291394079843010341777177808815495706610750101619166334015227893586796549725203621";

/// Values ζ(k) for k = 2, 3, …; entry `i` holds ζ(i + 2).
pub const ZETA: [&str; 23] = [
    "1.644934066848226436472415166646025189218949901206798437735558229370007470403200873833628900619758705304004318962337190679628724687005007787935102946330866276831733309367762605095251006872140054796811558794890360823277761919840756455876963235636709710096948902085932008051636478878338846044445184059825145250683387631422765879392958806320447219790847734091059020837828954927826389037976358334394204515912081809959345444877458796500880889408701111634710693161461842887981548624483590918344875738742839408276028756321434601",
    "1.202056903159594285399738161511449990764986292340498881792271555341838205786313090186455873609335258146199157795260719418491995998673283213776396837207900161453941782949360066719191575522242494243961563909664103291159095780965514651279918405105715255988015437109781102039827532566787603522336984941661811057014715778639499737523785277937030956025701853182790003076547107563048843320869711573742380793445031607625317714535444411831178182249718526357091824489987962035083357561720226033937858703281312678079900541773486912",
    "1.082323233711138191516003696541167902774750951918726907682976215444120616186968846556909635941699917232990813908042742414584071574570045349282003514716219207087783480910837029326188734826175273604235506219373750617111745349296867750733076066869341189058628337952795120334495890468862626948220835032983632149020532123955724846646225501156660455882686787653504495435137197495148863132897472588575145532476189232474908834318321655996289964805402049885566090671081314547243825177525046950255251413220769809559647768627752930",
    "1.036927755143369926331365486457034168057080919501912811974192677903803589786281484560043106557133336379620341466556609042800961779155970841835110721800876448662863371803535983639623651288889813352767752398275032022436845766444665958115993917977745039244643919666615966401620532520502151922671351256785974869286019744798432006726812975309199007746565586015265737300375615326831498979719350398378581319922884886425335104251602510849904346402941172432757634150816233224561864992714427226461411300758086831691649791813776967",
    "1.017343061984449139714517929790920527901817490032853561842408664004332182901957897882773977938535170530279191162254558867398181448333101853792916338072656731752530409653556187696279541392262368531663257941071900605201585468749971746571768142965382487121663354838277986293940844242356782586197662272250955379931245254739255260743349070316550278888958448860907592684599679732709343998304322790839149048083067316693908715825046123608895131717686500863758719267460349109584563317160434462080386762116265490798753437486574449",
    "1.008349277381922826839797549849796759599863560565238706417283136571601478317355735346096968913851323968961453651491074887286777419840335440315798301033984562121069463585243906583353964676997567696691427804314333947495215378902800259045551979353108370084210732939904610708564123560589062259977609869475407632000048163295125867692506307344136325556013603050073733024131870379510266247793954650225467042015510405582224239250510868837727077426002177100019545577898983604674540612195265076546116135654867915008085855494764299",
    "1.004077356197944339378685238508652465258960790649850020329110202652582952574748814395287230372371971124523648470282690026354299548073383970966270581799604618992754222287297459333028151505628361773822843314456080832422954810544833024244402534255772967813121021930029353975994747125306655542260905421389058622617194201065716879322813456783616645838899393760371748031942162040676468340393167867267217637270198235200529512467927023032221755036681688727329342110703109085901567230901232410553698536656644166828285367906321268",
    "1.002008392826082214417852769232412060485605851394888756548596615909785053390258398950393069127169586157408604765847060261425373970722430153069132498764251090929486876765453969794154078260229641544836250668629056707364521601531424421326337598815558052591454084890153952774745613345102874061327466069276339001629427086422011231622092412657533262054622932154546651799450386627782235647761660330281492364570399301119383985017167926002064923069795850945845796654854002694511875948156143037577615444334339839985141938354438743",
    "1.000994575127818085337145958900319017006019531564477517257788994636291465151912954397041968610385652754006892063205307677368090203536293807319069594984287395362160333472235259673205217893232883206654401387592799132860488839761476936477897698069711920633610229440543887315012190220764009893824920877746836403580902117032111080533988181567087055891846869666981504506157665967572221415404875729560004561966547703808093643469710926151783782529506836035725223798192875955834194285075812641681479259620965701545435452103017174",
    "1.000494188604119464558702282526469936468606435758208617119141436100054059798219814702591843023560629835506072948141298603299797940044724482914523405946661018278647436804868093403635598023706269369319467600853940758762316214728109915079894057387885145138506193646693689850240779780284012446398964440471384781971192996138529735759773672460996774041980166691202043919169561913190601796392895415497890950071275266636566144658424972012328857626621794399351922250533820899551183205143291034461300852928681777472493729582394908",
    "1.000246086553308048298637998047739670960416088458003404533040952133252019681940913049042808551900699474542980945266314269501249317870278749088047367626239874267340011196773455118989216125999216834776808426871842262612650534964367903963264490449282259812230431932838949358096130721037516472379637647887138155771432618956667623302357824957892434574119098047174275180349873453382020946785450345019741441245438905169670518847419626309960951347204003762901150231301470725342995405078135623205697841667481107736800136195258017",
    "1.000122713347578489146751836526357395714275105895509845136702671620896726829844209812892713953268135539023448405211797340640764852243805109390967296839296849960667716105732496299638299238322412706455343979082433981666110060722264828208290986113220060559195747981701055145609809178778054142240131902850013919626769149963140110698888170240397902034432800673856532081291534516767724414965628294294677482923917142062447800890738484142698892266647377555647228036273525006674674214301072032841726100800466391040010106107140667",
    "1.000061248135058704829258545105135333747481696169154549482755202252862941023177420876659782971998467512880490617208728508054316165504732758375412105018997048159105561567647701210317140138410057107537362585260935340691408270625001419275669915784007659154669028446599234258242376695819366979898874688800964640941494398732783836179292343623140066093076004558664029453093819842094390981404558596873265568072929858593044830258311766409262623998254161222081579979858229416002653862601745850664189395348885908155436780507917692",
    "1.000030588236307020493551728510645062587627948706858177506569932893332267156342279573072334347017548494366968444249283253029775758878190432179440477000343323483323107427564879084233891596149852007319602890911291547994377704233513295288929876140290936519712027742814844783938628585764015602171709262445062551067078139612739627072939186865201245471182924341322105191451973033081513943648714927413467699978032642074058504377061416326908291091015576344357255186147395980619774807861011221068419373795298745977138469836180066",
    "1.000015282259408651871732571487636722023237388990471531153105203588787087027953151786285604846322462346271218757278956438095840577103051278727892422440879424254371597742405259582764431988897839822754096321897737763462692603078177397713626250759020656935517060551458211776185906557810593867548329195923674773667522556988545529446489070744319819399793064973003376505292471049920250231334694102279633924761284347085731580331376133140405716530872363030272668857247437416653851587660722310515120520691985198557918477131411954",
    "1.000007637197637899762273600293563029213088249090262679095379843972935643290282459342081738636916671209602661597101103726013919619715976946824886877503812694094048955389414101787283051366267069529648981829436710171350272309485057936839772809221266595307676088278270895438200896075799314507936798835644434448699534665208412166261551221647902760659900362047589932305089146062094868561434956264829403618437901569614482677055476521735963437304969562851338206873920066475752990700603511188094871481988933011299566166352638524",
    "1.000003817293264999839856461644621939730454697218953331143174429987630039542650045638001968668989649549309210492316961761661920993360907581839433621258947199658567824178892750880103592008551745650463973394298366126845113334510685238678112752224001308431524766556482388011327276192423111367513334194542027822883267794543699007623407903534713911035062443244801562209442991451322467626897073139680375597650309007991057759735010800568753625530929532736645789370505224166785439019713291158617235951731113475707250769673361697",
    "1.000001908212716553938925656957795101353258571144838630235933046761823949705341309312664227118076302706716482559666184560975853424530398074308087916612539453037312942192048368911659495539762480719221659037935560123967289530456095373049466996990742533204678067798243163437070178609249449342074692232407459451341774232568458015333830000538704139349442097560944214111724644293311394475795372870602243004207988304747552382009406999015628601161865973989524814692489238043197880414113152977822038607570590228729595948881504235",
    "1.000000953962033872796113152038683449345943794187410595750056489851137513731143900257836097976387478954851588086815450989419062669945775714773686016316321832375029203457725272356560152637553780619129493932696319992113937946831436102576670951538786777577151900210217514892743265816215645658417493325627340200758730335472699775677937450078362083142836757969472014602876350599785144684033485888777888632142316854990382350841948860007863801977785801319742918857799850742090167103410331451652396931905418260126501262628174122",
    "1.000000476932986787806463116719604373045966446694784937600207487376596839087898159833876638564497256132663812118993800897487497296742391425540941709638504541104465557750974395318478384765861999845568497654118234744585588830598722197168440382302020957444129357282569742241016251903667676345721557726728908039481200000475033806260990302398510533609599582164167871735808469053890479287554175478685196507225827410777060052911569060844108830050631723918426243524015321919263148513978489698209069281145454157147892548797471427",
    "1.000000238450502727732990003648186752994935041821779658269849603116474458935622914821316156167743985454676288987368743781327070450749019540908785758521173381244859815055306908879859267641540252161876218757170258848262470321841943559147708332927964706539343281185913651572335644905654486709653523946209500621114316189702979445442771835553143813362414557797937932165204119995833943003901074302606692711772497176137938381951559096470214795415647052959032499645820291533819470533320913180051858124919010124471639546678921992",
    "1.000000119219925965311073067788718882326387254997784519858603225797236243730427435123174313352235859837639451496003668630538314437723370833105502260471461430514135922238508533943417379273334056378473251360373867791535267916770947557225089694550842676883929237928177753379185386303676085676274646216000794779671881234713787126317143888649835110614574775790797820843661134088486718157310735872764774215328172211992929587325241174095424532008428360261583782924923529701676915103591698085699736169404890346266729870097089357",
    "1.000000059608189051259479612440207935801227503918837302795864246972321724495355468544848206832825003613889968600093960257823513222253360353453057139710425718429282446348783959671557218173884060942978047379613580018433108529184217410725959290005247726992482643004689779716843636349280372599638758433798157191405166474644049700255501983853091639089342433957935546049825621468509238590534848805637896794877380675971643971739991705177516982566474434101151418213792727780671665234101644937439576169184135382590297662516330385",
];
